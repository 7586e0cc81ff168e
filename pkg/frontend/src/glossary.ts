/** Slide-over panel for looking up jargon without leaving the wizard. */

import { el } from './html.js';
import { searchGlossary } from './logic.js';
import { store } from './store.js';

export function renderGlossaryPanel(): HTMLElement {
  const state = store.get();
  const glossary = state.catalog?.glossary ?? {};
  const matches = searchGlossary(glossary, state.glossaryQuery);

  const input = el('input', {
    id: 'glossary-search',
    type: 'search',
    placeholder: 'Type a word, e.g. router',
    value: state.glossaryQuery,
    'aria-label': 'Search the glossary',
  });
  input.value = state.glossaryQuery;
  input.addEventListener('input', () => {
    store.set({ glossaryQuery: input.value });
  });

  const close = el('button', {
    type: 'button',
    class: 'ghost',
    'aria-label': 'Close the glossary',
    text: 'Close',
  });
  close.addEventListener('click', () => {
    store.set({ glossaryOpen: false, glossaryQuery: '' });
  });

  const list = el('dl', { class: 'glossary-list' });
  for (const [term, definition] of matches) {
    list.append(el('dt', { text: term }), el('dd', { text: definition }));
  }

  const body =
    matches.length > 0
      ? list
      : el('p', {
          class: 'empty-note',
          text: 'No matching terms. Try a shorter word.',
        });

  const panel = el(
    'aside',
    { class: 'glossary-panel', role: 'dialog', 'aria-label': 'Glossary' },
    el(
      'div',
      { class: 'panel-head' },
      el('h2', { text: 'Glossary' }),
      close,
    ),
    input,
    el('div', { class: 'scroll-list', 'data-scroll': 'glossary' }, body),
  );
  queueMicrotask(() => input.focus());
  return panel;
}
