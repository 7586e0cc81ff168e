/** String-to-DOM helpers. Everything user- or catalog-sourced is escaped. */

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
    .replace(/'/g, '&#39;');
}

const escapeRegExp = (text: string): string =>
  text.replace(/[.*+?^${}()|[\]\\]/g, '\\$&');

/**
 * Escape some prose and wrap any glossary term it mentions in a button that
 * opens the glossary. Longer terms win over their substrings.
 */
export function linkifyJargon(text: string, terms: string[]): string {
  if (terms.length === 0) return escapeHtml(text);
  const ordered = [...terms].sort((a, b) => b.length - a.length);
  const pattern = new RegExp(
    `\\b(${ordered.map(escapeRegExp).join('|')})\\b`,
    'gi',
  );
  let out = '';
  let last = 0;
  for (const match of text.matchAll(pattern)) {
    const at = match.index ?? 0;
    const word = match[0];
    out += escapeHtml(text.slice(last, at));
    out +=
      `<button type="button" class="jargon" data-term="${escapeHtml(word.toLowerCase())}"` +
      ` title="What does this mean?">${escapeHtml(word)}</button>`;
    last = at + word.length;
  }
  out += escapeHtml(text.slice(last));
  return out;
}

type Attrs = Record<string, string | boolean>;

/** createElement with attributes and children in one call. */
export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Attrs = {},
  ...children: Array<Node | string>
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (typeof value === 'boolean') {
      if (value) node.setAttribute(key, '');
    } else if (key === 'text') {
      node.textContent = value;
    } else if (key === 'html') {
      node.innerHTML = value;
    } else {
      node.setAttribute(key, value);
    }
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}
