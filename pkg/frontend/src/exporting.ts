// Export of flagged sentences: JSON mirrors the service response plus the
// threshold used; CSV carries the same rows.

import type { UiDocument } from './model.js'
import { highlightedSentences } from './model.js'

export interface ExportPayload {
  threshold: number
  sentences: {
    text: string
    probability: number
    worthy: boolean
    section_type: string
  }[]
}

export function exportPayload(doc: UiDocument): ExportPayload {
  return {
    threshold: doc.threshold,
    sentences: highlightedSentences(doc).map((s) => ({
      text: s.text,
      probability: s.probability,
      worthy: s.worthy,
      section_type: s.section_type,
    })),
  }
}

export function toJson(doc: UiDocument): string {
  return JSON.stringify(exportPayload(doc), null, 2)
}

function csvEscape(value: string): string {
  if (/[",\n]/.test(value)) return '"' + value.replace(/"/g, '""') + '"'
  return value
}

export function toCsv(doc: UiDocument): string {
  const header = 'text,probability,worthy,section_type'
  const rows = highlightedSentences(doc).map((s) =>
    [
      csvEscape(s.text),
      String(s.probability),
      String(s.worthy),
      csvEscape(s.section_type),
    ].join(','),
  )
  return [header, ...rows].join('\n') + '\n'
}
