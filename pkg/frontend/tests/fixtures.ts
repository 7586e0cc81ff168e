/** Small hand-rolled catalog and report documents for unit tests. */

import type { CatalogDoc, ReportDoc, ReportThreatRow } from '../src/types.js';

export function tinyCatalog(): CatalogDoc {
  return {
    schema_version: 1,
    devices: [
      { id: 'lamp', label: 'Clever lamp', categories: [1] },
      { id: 'hub', label: 'Signal hub', categories: [1, 2] },
      { id: 'plug', label: 'Power plug', categories: [3] },
    ],
    categories: [
      {
        id: 1,
        description: 'Things with bulbs',
        threat_ids: [1, 2],
        lindunn_factors: ['observable habits'],
        bonus: 0.5,
      },
      {
        id: 2,
        description: 'Things that relay traffic',
        threat_ids: [3],
        lindunn_factors: ['linkable traffic', 'identifiable traffic'],
        bonus: 1.0,
      },
      {
        id: 3,
        description: 'Things that switch power',
        threat_ids: [4],
        lindunn_factors: [],
        bonus: 0,
      },
    ],
    risk_factors: [
      {
        id: 'R1',
        weight: 3,
        question_text: 'Is your home Wi-Fi open?',
        justification: 'Open networks expose everything.',
        related_threats: [1],
        off_reductions: [],
      },
      {
        id: 'R2',
        weight: 1,
        question_text: 'Is the hub firmware out of date?',
        justification: 'Old firmware keeps old holes.',
        related_threats: [3],
        off_reductions: [],
      },
      {
        id: 'R3',
        weight: 2,
        question_text: 'Is the admin page unlocked?',
        justification: 'Anyone on the network could reconfigure it.',
        related_threats: [],
        off_reductions: [2],
      },
      {
        id: 'R4',
        weight: 1,
        question_text: 'Does the plug use a default password?',
        justification: 'Default passwords are public knowledge.',
        related_threats: [4],
        off_reductions: [],
      },
    ],
    threats: [
      {
        id: 1,
        stride: 'Spoofing',
        short_name: 'fake-commands',
        description: 'Someone nearby imitates the app and flashes the lamp.',
        mitigation: 'Pair the lamp only over your own router.',
        vector: 'CVSS:3.1/AV:A/AC:L/PR:N/UI:N/S:U/C:N/I:L/A:L',
        scores: { base: 5.4, temporal: 5.1, environmental: 4.8 },
      },
      {
        id: 2,
        stride: 'Tampering',
        short_name: 'lamp-rewrite',
        description: 'Unsigned firmware lets an attacker rewrite the lamp.',
        mitigation: 'Install updates from the official app.',
        vector: 'CVSS:3.1/AV:N/AC:H/PR:N/UI:N/S:U/C:L/I:H/A:L',
        scores: { base: 6.8, temporal: 6.3, environmental: 6.0 },
      },
      {
        id: 3,
        stride: 'Information disclosure',
        short_name: 'hub-snooping',
        description: 'The hub relays readings that reveal when you are home.',
        mitigation: 'Turn on encryption in the hub settings.',
        vector: 'CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:N/A:N',
        scores: { base: 7.5, temporal: 7.2, environmental: 7.0 },
      },
      {
        id: 4,
        stride: 'Denial of service',
        short_name: 'plug-flood',
        description: 'A flood of requests makes the plug stop responding.',
        mitigation: 'Give the plug a strong password.',
        vector: 'CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:H',
        scores: { base: 7.5, temporal: 7.0, environmental: 6.8 },
      },
    ],
    glossary: {
      router: 'The box that shares your internet connection around the home.',
      firmware: 'The built-in software a device runs.',
      encryption: 'Scrambling data so only the intended reader can use it.',
    },
    guidance_links: {
      lamp: [{ label: 'Lamp safety basics', url: 'https://example.org/lamp' }],
      hub: [{ label: 'Hub hardening guide', url: 'https://example.org/hub' }],
      plug: [{ label: 'Plug checklist', url: 'https://example.org/plug' }],
    },
  };
}

export function tinyRow(overrides: Partial<ReportThreatRow> = {}): ReportThreatRow {
  return {
    rank: 1,
    threat_id: 3,
    short_name: 'hub-snooping',
    stride: 'Information disclosure',
    description: 'The hub relays readings through your router unencrypted.',
    mitigation: 'Turn on encryption in the hub settings.',
    vector: 'CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:N/A:N',
    scores: {
      base: 7.5,
      temporal: 7.2,
      environmental: 7.0,
      base_severity: 'High',
      temporal_severity: 'High',
      environmental_severity: 'High',
    },
    base_mean: 7.233333333333333,
    additions: [],
    subtractions_applied: 0,
    lindunn_bonus: 1.5,
    zeroed_by_rule: false,
    final: 8.733333333333333,
    ...overrides,
  };
}

export function tinyReport(): ReportDoc {
  return {
    schema_version: 1,
    input: {
      devices: ['hub', 'lamp'],
      risk_factors: ['R1'],
      connections: [['hub', 'lamp']],
      display_name: 'Alex',
    },
    active_categories: [
      {
        id: 1,
        description: 'Things with bulbs',
        bonus: 0.5,
        lindunn_factors: ['observable habits'],
      },
      {
        id: 2,
        description: 'Things that relay traffic',
        bonus: 1.0,
        lindunn_factors: ['linkable traffic', 'identifiable traffic'],
      },
    ],
    threats: [
      tinyRow(),
      tinyRow({
        rank: 2,
        threat_id: 1,
        short_name: 'fake-commands',
        description: 'Someone nearby imitates the app and flashes the lamp.',
        mitigation: 'Pair the lamp only over your own router.',
        scores: {
          base: 5.4,
          temporal: 5.1,
          environmental: 4.8,
          base_severity: 'Medium',
          temporal_severity: 'Medium',
          environmental_severity: 'Medium',
        },
        base_mean: 5.1,
        additions: [['R1', 3]],
        subtractions_applied: 1,
        lindunn_bonus: 1.5,
        final: 8.6,
      }),
      tinyRow({
        rank: 3,
        threat_id: 2,
        short_name: 'lamp-rewrite',
        description: 'Unsigned firmware lets an attacker rewrite the lamp.',
        mitigation: 'Install updates from the official app.',
        scores: {
          base: 6.8,
          temporal: 6.3,
          environmental: 6.0,
          base_severity: 'Medium',
          temporal_severity: 'Medium',
          environmental_severity: 'Medium',
        },
        base_mean: 6.366666666666666,
        additions: [],
        subtractions_applied: 0,
        lindunn_bonus: 1.5,
        final: 7.866666666666666,
      }),
    ],
    guidance: [
      {
        device: 'hub',
        label: 'Signal hub',
        links: [{ label: 'Hub hardening guide', url: 'https://example.org/hub' }],
      },
      {
        device: 'lamp',
        label: 'Clever lamp',
        links: [{ label: 'Lamp safety basics', url: 'https://example.org/lamp' }],
      },
    ],
  };
}
