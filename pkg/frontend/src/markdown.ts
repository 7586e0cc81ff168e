/** Turn the results page into Markdown for the copy button. */

import type { CatalogDoc, ReportDoc } from './types.js';
import { scoreBreakdown } from './logic.js';

function deviceLabel(catalog: CatalogDoc | null, id: string): string {
  const doc = catalog?.devices.find((d) => d.id === id);
  return doc ? doc.label : id;
}

export function resultsAsMarkdown(
  report: ReportDoc,
  catalog: CatalogDoc | null,
  dismissed: number[],
): string {
  const hidden = new Set(dismissed);
  const rows = report.threats.filter((t) => !hidden.has(t.threat_id));
  const lines: string[] = [];

  const name = report.input.display_name;
  lines.push(name ? `# Threat check for ${name}` : '# Threat check');
  lines.push('');
  lines.push(
    '- Devices: ' +
      report.input.devices.map((d) => deviceLabel(catalog, d)).join(', '),
  );
  if (report.input.risk_factors.length > 0) {
    lines.push('- Reported gaps: ' + report.input.risk_factors.join(', '));
  }
  if (report.input.connections.length > 0) {
    lines.push(
      '- Connections noted: ' +
        report.input.connections
          .map(([a, b]) => `${deviceLabel(catalog, a)} - ${deviceLabel(catalog, b)}`)
          .join('; '),
    );
  }
  if (dismissed.length > 0) {
    lines.push(`- Hidden by you: ${dismissed.length} threat(s)`);
  }
  lines.push('');

  if (rows.length === 0) {
    lines.push('No threats were identified for this selection.');
    lines.push('');
    return lines.join('\n');
  }

  lines.push('| Rank | Threat | Score |');
  lines.push('| ---: | --- | ---: |');
  for (const row of rows) {
    lines.push(`| ${row.rank} | ${row.short_name} | ${row.final.toFixed(2)} |`);
  }
  lines.push('');

  for (const row of rows) {
    lines.push(`## ${row.rank}. ${row.short_name} (${row.final.toFixed(2)})`);
    lines.push('');
    lines.push(row.description);
    lines.push('');
    lines.push('Why this score:');
    for (const part of scoreBreakdown(row)) {
      lines.push(`- ${part}`);
    }
    lines.push('');
    lines.push(`**What to do:** ${row.mitigation}`);
    lines.push('');
  }

  if (report.guidance.length > 0) {
    lines.push('## Where to read more');
    lines.push('');
    for (const entry of report.guidance) {
      lines.push(`- ${deviceLabel(catalog, entry.device)}:`);
      for (const link of entry.links) {
        lines.push(`  - [${link.label}](${link.url})`);
      }
    }
    lines.push('');
  }

  return lines.join('\n');
}
