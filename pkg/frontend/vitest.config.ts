import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    environment: 'happy-dom',
    // The scoring service is deliberately CORS-free (it only ever serves the
    // page itself), so the end-to-end test opts out of the browser stand-in's
    // same-origin enforcement to reach the ephemeral test port.
    environmentOptions: {
      happyDOM: { settings: { fetch: { disableSameOriginPolicy: true } } },
    },
    include: ['tests/**/*.test.ts'],
    testTimeout: 20000,
    hookTimeout: 20000,
  },
});
