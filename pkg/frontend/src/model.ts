// Client-side document state. Probabilities always come from the
// service; everything here (threshold filtering, color bins, dirty
// tracking) is a pure function over that cached response.

import type { ScoredSentence, SectionType } from './types.js'

export type HighlightBin = 'none' | 'low' | 'medium' | 'high'

export interface UiSentence extends ScoredSentence {
  highlighted: boolean
  bin: HighlightBin
}

export interface UiDocument {
  rawText: string
  threshold: number
  sentences: UiSentence[]
  dirty: boolean
  checkedAt: number | null
}

export function emptyDocument(): UiDocument {
  return { rawText: '', threshold: 0.5, sentences: [], dirty: false, checkedAt: null }
}

/** Color bin by probability: below 0.5, 0.5-0.8, above 0.8. */
export function colorBin(probability: number): HighlightBin {
  if (probability > 0.8) return 'high'
  if (probability >= 0.5) return 'medium'
  return 'low'
}

/** Highlight rule: a sentence is flagged iff probability >= threshold. */
export function isHighlighted(probability: number, threshold: number): boolean {
  return probability >= threshold
}

function decorate(scored: ScoredSentence[], threshold: number): UiSentence[] {
  return scored.map((s) => ({
    ...s,
    highlighted: isHighlighted(s.probability, threshold),
    bin: isHighlighted(s.probability, threshold) ? colorBin(s.probability) : 'none',
  }))
}

/** Install a fresh service response; clears the dirty flag. */
export function applyResponse(
  doc: UiDocument,
  scored: ScoredSentence[],
  now: number = Date.now(),
): UiDocument {
  return {
    ...doc,
    sentences: decorate(scored, doc.threshold),
    dirty: false,
    checkedAt: now,
  }
}

/**
 * Re-filter the cached probabilities at a new threshold. Pure client-side
 * recompute: no probability changes, no network involved.
 */
export function applyThreshold(doc: UiDocument, threshold: number): UiDocument {
  return {
    ...doc,
    threshold,
    sentences: decorate(doc.sentences, threshold),
  }
}

/** Text edits invalidate the cached results until the next check. */
export function editText(doc: UiDocument, rawText: string): UiDocument {
  if (rawText === doc.rawText) return doc
  return { ...doc, rawText, dirty: true }
}

export function highlightedSentences(doc: UiDocument): UiSentence[] {
  return doc.sentences.filter((s) => s.highlighted)
}

// --- paragraph handling ---------------------------------------------------

export interface ParagraphBlock {
  text: string
  section: SectionType
}

/** Split pasted text into paragraphs on blank lines. */
export function splitParagraphs(rawText: string, sections?: SectionType[]): ParagraphBlock[] {
  const parts = rawText
    .split(/\n\s*\n/)
    .map((p) => p.replace(/\s+/g, ' ').trim())
    .filter((p) => p.length > 0)
  return parts.map((text, i) => ({ text, section: sections?.[i] ?? 'other' }))
}

/** Request payload: one record per paragraph with its section label. */
export function paragraphsToRequest(blocks: ParagraphBlock[]) {
  return blocks.map((b) => ({ text: b.text, section_type: b.section }))
}
