/** The four-page wizard: intro, devices, questions, results. One render
 * function per page, re-run whenever the store changes. */

import {
  fetchCatalog,
  ModelRejectedError,
  postModel,
  ServiceUnreachableError,
} from './api.js';
import { renderGlossaryPanel } from './glossary.js';
import { el, linkifyJargon } from './html.js';
import {
  devicePairs,
  hasPair,
  relevantFactors,
  scoreBreakdown,
  togglePair,
} from './logic.js';
import { resultsAsMarkdown } from './markdown.js';
import { type Scheme, store } from './store.js';
import type { CatalogDoc, ReportThreatRow } from './types.js';

const SCHEME_KEY = 'hometm-scheme';

export function loadScheme(): Scheme {
  try {
    const saved = window.localStorage.getItem(SCHEME_KEY);
    if (saved === 'calm' || saved === 'slate') return saved;
  } catch {
    // Private browsing or storage disabled: fall back to the default.
  }
  return 'calm';
}

function saveScheme(scheme: Scheme): void {
  try {
    window.localStorage.setItem(SCHEME_KEY, scheme);
  } catch {
    // The preference just will not stick; nothing else depends on it.
  }
}

export async function bootCatalog(): Promise<void> {
  store.set({ blockingError: null });
  try {
    const catalog = await fetchCatalog();
    store.set({ catalog });
  } catch {
    store.set({
      blockingError:
        'The helper service on this computer is not answering. ' +
        'Start it with "hometm-serve" in a terminal, then press Try again.',
    });
  }
}

export function mountApp(root: HTMLElement): () => void {
  store.set({ scheme: loadScheme() });
  const unsubscribe = store.subscribe(() => renderApp(root));
  const onKey = (event: KeyboardEvent): void => {
    if (event.key !== 'Escape') return;
    const s = store.get();
    if (s.glossaryOpen) store.set({ glossaryOpen: false, glossaryQuery: '' });
    else if (s.guidanceOpen) store.set({ guidanceOpen: false });
  };
  document.addEventListener('keydown', onKey);
  renderApp(root);
  void bootCatalog();
  return () => {
    unsubscribe();
    document.removeEventListener('keydown', onKey);
  };
}

export function renderApp(root: HTMLElement): void {
  const s = store.get();
  document.documentElement.dataset['scheme'] = s.scheme;
  root.innerHTML = '';
  root.append(renderHeader());

  const main = el('main', { class: 'page', 'data-step': s.step });
  if (s.blockingError) {
    main.append(renderBlockingError(s.blockingError));
  } else if (!s.catalog) {
    main.append(el('p', { class: 'empty-note', text: 'Loading the catalog…' }));
  } else {
    switch (s.step) {
      case 'intro':
        main.append(renderIntro());
        break;
      case 'devices':
        main.append(renderDevices(s.catalog));
        break;
      case 'questions':
        main.append(renderQuestions(s.catalog));
        break;
      case 'results':
        main.append(renderResults(s.catalog));
        break;
    }
  }
  root.append(main);

  if (s.glossaryOpen) root.append(renderGlossaryPanel());
  if (s.guidanceOpen && s.report) root.append(renderGuidance(s.catalog));

  root.addEventListener('click', onJargonClick);
}

function onJargonClick(event: Event): void {
  const target = event.target as HTMLElement | null;
  const word = target?.closest<HTMLElement>('button.jargon')?.dataset['term'];
  if (word) store.set({ glossaryOpen: true, glossaryQuery: word });
}

function renderHeader(): HTMLElement {
  const s = store.get();
  const next: Scheme = s.scheme === 'calm' ? 'slate' : 'calm';

  const schemeButton = el('button', {
    type: 'button',
    class: 'ghost',
    text: `Switch to ${next} colours`,
  });
  schemeButton.addEventListener('click', () => {
    saveScheme(next);
    store.set({ scheme: next });
  });

  const glossaryButton = el('button', {
    type: 'button',
    class: 'ghost',
    text: 'Glossary',
    'aria-haspopup': 'dialog',
  });
  glossaryButton.addEventListener('click', () => {
    store.set({ glossaryOpen: !s.glossaryOpen, glossaryQuery: '' });
  });

  return el(
    'header',
    { class: 'top-bar' },
    el('h1', { text: 'Home device check' }),
    el('div', { class: 'top-actions' }, glossaryButton, schemeButton),
  );
}

function renderBlockingError(message: string): HTMLElement {
  const retry = el('button', { type: 'button', text: 'Try again' });
  retry.addEventListener('click', () => void bootCatalog());
  return el(
    'section',
    { class: 'card error-card', role: 'alert' },
    el('h2', { text: 'Something is not running yet' }),
    el('p', { text: message }),
    retry,
  );
}

function renderIntro(): HTMLElement {
  const s = store.get();
  const nameInput = el('input', {
    id: 'display-name',
    type: 'text',
    value: s.displayName,
    autocomplete: 'off',
    placeholder: 'Optional',
  });
  nameInput.value = s.displayName;

  const begin = el('button', { type: 'button', class: 'primary', text: 'Begin' });
  begin.addEventListener('click', () => {
    store.set({ displayName: nameInput.value.trim(), step: 'devices', fieldError: null });
  });

  return el(
    'section',
    { class: 'card' },
    el('h2', { text: 'How safe is your smart home?' }),
    el('p', {
      text:
        'Tell us which connected devices you own and answer a few yes/no ' +
        'questions. You will get a ranked list of the most likely security ' +
        'and privacy problems, each with a plain-English fix.',
    }),
    el('p', {
      class: 'privacy-note',
      text:
        'Everything runs on this computer. Nothing you type here is sent ' +
        'anywhere else or saved after you close the page.',
    }),
    el('label', { for: 'display-name', text: 'What should we call you?' }),
    nameInput,
    el('div', { class: 'nav-row' }, begin),
  );
}

function renderDevices(catalog: CatalogDoc): HTMLElement {
  const s = store.get();

  const list = el('ul', { class: 'choice-list scroll-list', 'data-scroll': 'devices' });
  for (const device of catalog.devices) {
    const box = el('input', {
      type: 'checkbox',
      id: `device-${device.id}`,
      'data-device': device.id,
    }) as HTMLInputElement;
    box.checked = s.devices.includes(device.id);
    box.addEventListener('change', () => {
      const current = store.get();
      const devices = box.checked
        ? [...current.devices, device.id]
        : current.devices.filter((d) => d !== device.id);
      const keep = new Set(devices);
      const connections = current.connections.filter(
        ([a, b]) => keep.has(a) && keep.has(b),
      );
      store.set({ devices, connections, fieldError: null });
    });
    list.append(
      el(
        'li',
        {},
        el(
          'label',
          { class: 'choice', for: `device-${device.id}` },
          box,
          el('span', { text: device.label }),
        ),
      ),
    );
  }

  const back = el('button', { type: 'button', class: 'ghost', text: 'Back' });
  back.addEventListener('click', () => store.set({ step: 'intro', fieldError: null }));

  const next = el('button', { type: 'button', class: 'primary', text: 'Next' });
  next.addEventListener('click', () => {
    if (store.get().devices.length === 0) {
      store.set({ fieldError: 'Choose at least one device to continue.' });
      return;
    }
    store.set({ step: 'questions', fieldError: null });
  });

  const card = el(
    'section',
    { class: 'card' },
    el('h2', { text: 'Which of these do you have at home?' }),
    el('p', { text: 'Tick everything that is switched on in your home, even occasionally.' }),
    list,
    el('p', { class: 'scroll-hint', 'aria-hidden': 'true', text: 'Scroll for more' }),
  );
  if (s.fieldError) {
    card.append(el('p', { class: 'field-error', role: 'alert', text: s.fieldError }));
  }
  card.append(el('div', { class: 'nav-row' }, back, next));
  markScrollable(list);
  return card;
}

function renderQuestions(catalog: CatalogDoc): HTMLElement {
  const s = store.get();
  const card = el('section', { class: 'card' });
  card.append(el('h2', { text: 'A few quick questions' }));

  if (s.devices.length >= 2) {
    const pairs = devicePairs(s.devices);
    const pairList = el('ul', { class: 'choice-list' });
    for (const [a, b] of pairs) {
      const labelA = deviceLabel(catalog, a);
      const labelB = deviceLabel(catalog, b);
      const box = el('input', {
        type: 'checkbox',
        id: `pair-${a}-${b}`,
      }) as HTMLInputElement;
      box.checked = hasPair(s.connections, a, b);
      box.addEventListener('change', () => {
        store.set({ connections: togglePair(store.get().connections, a, b) });
      });
      pairList.append(
        el(
          'li',
          {},
          el(
            'label',
            { class: 'choice', for: `pair-${a}-${b}` },
            box,
            el('span', { text: `${labelA} talks to ${labelB}` }),
          ),
        ),
      );
    }
    card.append(
      el('h3', { text: 'Do any of these talk to each other?' }),
      el('p', {
        class: 'muted',
        text: 'This is noted for context only; it does not change any score.',
      }),
      pairList,
    );
  }

  const factors = relevantFactors(catalog, s.devices);
  const questionList = el('div', { class: 'question-list scroll-list', 'data-scroll': 'questions' });
  for (const factor of factors) {
    const yes = el('input', {
      type: 'radio',
      name: `q-${factor.id}`,
      id: `q-${factor.id}-yes`,
      'data-question': factor.id,
      'data-answer': 'yes',
    }) as HTMLInputElement;
    const no = el('input', {
      type: 'radio',
      name: `q-${factor.id}`,
      id: `q-${factor.id}-no`,
      'data-question': factor.id,
      'data-answer': 'no',
    }) as HTMLInputElement;
    yes.checked = s.answers[factor.id] === true;
    no.checked = s.answers[factor.id] !== true;
    const record = (value: boolean) => () => {
      store.set({ answers: { ...store.get().answers, [factor.id]: value } });
    };
    yes.addEventListener('change', record(true));
    no.addEventListener('change', record(false));
    questionList.append(
      el(
        'fieldset',
        { class: 'question' },
        el('legend', { text: factor.question_text }),
        el(
          'label',
          { class: 'choice inline', for: `q-${factor.id}-yes` },
          yes,
          el('span', { text: 'Yes' }),
        ),
        el(
          'label',
          { class: 'choice inline', for: `q-${factor.id}-no` },
          no,
          el('span', { text: 'No' }),
        ),
      ),
    );
  }

  card.append(
    el('h3', { text: 'Answer yes or no for your home' }),
    questionList,
    el('p', { class: 'scroll-hint', 'aria-hidden': 'true', text: 'Scroll for more' }),
  );

  if (s.fieldError) {
    card.append(el('p', { class: 'field-error', role: 'alert', text: s.fieldError }));
  }

  const back = el('button', { type: 'button', class: 'ghost', text: 'Back' });
  back.addEventListener('click', () => store.set({ step: 'devices', fieldError: null }));

  const see = el('button', {
    type: 'button',
    class: 'primary',
    text: s.loading ? 'Scoring…' : 'See my results',
  });
  if (s.loading) see.setAttribute('disabled', '');
  see.addEventListener('click', () => void submitModel(catalog));

  card.append(el('div', { class: 'nav-row' }, back, see));
  markScrollable(questionList);
  return card;
}

async function submitModel(catalog: CatalogDoc): Promise<void> {
  const s = store.get();
  const factors = relevantFactors(catalog, s.devices)
    .filter((factor) => s.answers[factor.id] === true)
    .map((factor) => factor.id)
    .sort((a, b) => Number(a.slice(1)) - Number(b.slice(1)));
  store.set({ loading: true, fieldError: null });
  try {
    const report = await postModel({
      devices: [...s.devices].sort(),
      risk_factors: factors,
      connections: s.connections,
      ...(s.displayName ? { display_name: s.displayName } : {}),
    });
    store.set({ report, dismissed: [], step: 'results', loading: false });
  } catch (err) {
    if (err instanceof ModelRejectedError) {
      const parts = Object.entries(err.fields).map(
        ([field, messages]) => `${field}: ${messages.join('; ')}`,
      );
      store.set({ loading: false, fieldError: parts.join(' — ') });
    } else if (err instanceof ServiceUnreachableError) {
      store.set({
        loading: false,
        blockingError:
          'The helper service stopped answering while scoring. Start it ' +
          'again with "hometm-serve", then press Try again.',
      });
    } else {
      // An aborted request means a newer one replaced it; stay quiet.
      store.set({ loading: false });
    }
  }
}

function deviceLabel(catalog: CatalogDoc | null, id: string): string {
  const doc = catalog?.devices.find((d) => d.id === id);
  return doc ? doc.label : id;
}

function renderResults(catalog: CatalogDoc | null): HTMLElement {
  const s = store.get();
  const report = s.report;
  const card = el('section', { class: 'card results' });
  if (!report) {
    card.append(el('p', { class: 'empty-note', text: 'No results yet.' }));
    return card;
  }

  const hidden = new Set(s.dismissed);
  const rows = report.threats.filter((row) => !hidden.has(row.threat_id));
  const greeting = s.displayName
    ? `Here is what matters most, ${s.displayName}.`
    : 'Here is what matters most.';

  card.append(
    el('h2', { text: 'Your ranked risks' }),
    el('p', { text: greeting }),
  );

  if (report.threats.length === 0) {
    card.append(
      el('p', { class: 'empty-note', text: 'No threats were identified for this selection.' }),
      el('p', {
        class: 'muted',
        text: 'Check the device list and reported gaps, then run the model again.',
      }),
    );
  } else if (rows.length === 0) {
    card.append(
      el('p', { class: 'empty-note', text: 'You have hidden every row.' }),
    );
  }

  const terms = Object.keys(s.catalog?.glossary ?? {});
  const list = el('ol', { class: 'threat-list scroll-list', 'data-scroll': 'results' });
  for (const row of rows) {
    list.append(renderThreatRow(row, terms));
  }
  card.append(
    list,
    el('p', { class: 'scroll-hint', 'aria-hidden': 'true', text: 'Scroll for more' }),
  );

  const toolbar = el('div', { class: 'nav-row toolbar' });

  if (s.dismissed.length > 0) {
    const restore = el('button', {
      type: 'button',
      class: 'ghost',
      text: `Show ${s.dismissed.length} hidden`,
    });
    restore.addEventListener('click', () => store.set({ dismissed: [] }));
    toolbar.append(restore);
  }

  const copy = el('button', { type: 'button', text: 'Copy as Markdown' });
  copy.addEventListener('click', () => {
    const text = resultsAsMarkdown(report, catalog, store.get().dismissed);
    void copyText(text).then((done) => {
      copy.textContent = done ? 'Copied!' : 'Copy failed — try again';
    });
  });
  toolbar.append(copy);

  if (report.guidance.length > 0) {
    const guidance = el('button', {
      type: 'button',
      text: 'Where to read more',
      'aria-haspopup': 'dialog',
    });
    guidance.addEventListener('click', () => store.set({ guidanceOpen: true }));
    toolbar.append(guidance);
  }

  const again = el('button', { type: 'button', class: 'ghost', text: 'Start over' });
  again.addEventListener('click', () => store.startOver());
  toolbar.append(again);

  card.append(toolbar);
  markScrollable(list);
  return card;
}

function renderThreatRow(row: ReportThreatRow, terms: string[]): HTMLElement {
  const dismiss = el('button', {
    type: 'button',
    class: 'ghost dismiss',
    text: 'Dismiss',
    'aria-label': `Dismiss ${row.short_name}`,
    'data-dismiss': String(row.threat_id),
  });
  dismiss.addEventListener('click', (event) => {
    event.preventDefault();
    event.stopPropagation();
    const current = store.get();
    store.set({ dismissed: [...current.dismissed, row.threat_id] });
  });

  const summary = el(
    'summary',
    { class: 'threat-summary' },
    el('span', { class: 'rank', text: `${row.rank}.` }),
    el('span', { class: 'name', text: row.short_name }),
    el('span', { class: 'score', text: row.final.toFixed(2) }),
    dismiss,
  );

  const breakdown = el('ul', { class: 'breakdown' });
  for (const line of scoreBreakdown(row)) {
    breakdown.append(el('li', { text: line }));
  }

  const body = el(
    'div',
    { class: 'threat-body' },
    el('p', { html: linkifyJargon(row.description, terms) }),
    el('h4', { text: 'Why this score' }),
    breakdown,
    el('h4', { text: 'What to do' }),
    el('p', { html: linkifyJargon(row.mitigation, terms) }),
    el('p', { class: 'muted vector', text: row.vector }),
  );

  return el(
    'li',
    { 'data-threat': String(row.threat_id) },
    el('details', { class: 'threat-row' }, summary, body),
  );
}

function renderGuidance(catalog: CatalogDoc | null): HTMLElement {
  const s = store.get();
  const close = el('button', {
    type: 'button',
    class: 'ghost',
    text: 'Close',
    'aria-label': 'Close the guidance list',
  });
  close.addEventListener('click', () => store.set({ guidanceOpen: false }));

  const body = el('div', { class: 'scroll-list' });
  for (const entry of s.report?.guidance ?? []) {
    body.append(el('h3', { text: deviceLabel(catalog, entry.device) }));
    const links = el('ul', {});
    for (const link of entry.links) {
      links.append(
        el(
          'li',
          {},
          el('a', { href: link.url, target: '_blank', rel: 'noreferrer', text: link.label }),
        ),
      );
    }
    body.append(links);
  }

  return el(
    'aside',
    { class: 'glossary-panel', role: 'dialog', 'aria-label': 'Further guidance' },
    el('div', { class: 'panel-head' }, el('h2', { text: 'Where to read more' }), close),
    body,
  );
}

async function copyText(text: string): Promise<boolean> {
  try {
    await navigator.clipboard.writeText(text);
    return true;
  } catch {
    return false;
  }
}

/** Flag lists that overflow so the stylesheet can show a fade + hint. */
function markScrollable(listing: HTMLElement): void {
  queueMicrotask(() => {
    if (listing.scrollHeight > listing.clientHeight + 1) {
      listing.classList.add('has-more');
      listing.addEventListener('scroll', () => {
        const nearEnd =
          listing.scrollTop + listing.clientHeight >= listing.scrollHeight - 4;
        listing.classList.toggle('has-more', !nearEnd);
      });
    }
  });
}
