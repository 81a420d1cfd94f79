// DOM wiring for the manuscript checker. All prediction numbers come
// from the service; this layer only renders the cached state.

import { fetchHealth, predictDocument, ServiceError } from './api.js'
import {
  applyResponse,
  applyThreshold,
  editText,
  emptyDocument,
  highlightedSentences,
  paragraphsToRequest,
  splitParagraphs,
  UiDocument,
} from './model.js'
import { toCsv, toJson } from './exporting.js'
import { SECTION_TYPES, SectionType } from './types.js'

const SERVICE_URL = (window as any).CITEWORTH_SERVICE_URL ?? ''

let doc: UiDocument = emptyDocument()
let sectionChoices: SectionType[] = []

const $ = <T extends HTMLElement>(id: string) => document.getElementById(id) as T

function banner(message: string | null) {
  const el = $('banner')
  el.textContent = message ?? ''
  el.style.display = message ? 'block' : 'none'
}

function renderSections() {
  const blocks = splitParagraphs(($('draft') as HTMLTextAreaElement).value)
  const host = $('sections')
  host.innerHTML = ''
  blocks.forEach((block, i) => {
    const row = document.createElement('div')
    row.className = 'section-row'
    const label = document.createElement('span')
    label.textContent = block.text.slice(0, 60) + (block.text.length > 60 ? '…' : '')
    const select = document.createElement('select')
    for (const s of SECTION_TYPES) {
      const opt = document.createElement('option')
      opt.value = s
      opt.textContent = s
      select.appendChild(opt)
    }
    select.value = sectionChoices[i] ?? 'other'
    select.addEventListener('change', () => {
      sectionChoices[i] = select.value as SectionType
    })
    row.append(select, label)
    host.appendChild(row)
  })
}

function renderResults() {
  const host = $('results')
  host.innerHTML = ''
  host.classList.toggle('stale', doc.dirty)
  for (const s of doc.sentences) {
    const span = document.createElement('span')
    span.className = `sentence bin-${s.bin}`
    span.textContent = s.text + ' '
    span.title = `p = ${s.probability.toFixed(3)} (${s.section_type})`
    if (s.highlighted) {
      const mark = document.createElement('sup')
      mark.className = 'cite-mark'
      mark.textContent = '[cite?]'
      span.appendChild(mark)
    }
    host.appendChild(span)
  }
  $('summary').textContent = doc.sentences.length
    ? `${highlightedSentences(doc).length} of ${doc.sentences.length} sentences flagged ` +
      `at threshold ${doc.threshold.toFixed(2)}${doc.dirty ? ' (stale — re-check)' : ''}`
    : ''
}

async function check() {
  const text = ($('draft') as HTMLTextAreaElement).value
  doc = editText(doc, text)
  const blocks = splitParagraphs(text, sectionChoices)
  if (blocks.length === 0) {
    banner('Paste some text first.')
    return
  }
  banner(null)
  try {
    const response = await predictDocument(SERVICE_URL, {
      sentences: paragraphsToRequest(blocks),
      threshold: doc.threshold,
    })
    doc = applyResponse(doc, response.sentences)
    renderResults()
  } catch (err) {
    if ((err as Error).name === 'AbortError') return
    const detail = err instanceof ServiceError ? `${err.status}: ${err.message}` : String(err)
    banner(`Prediction service error — ${detail}`)
  }
}

function download(filename: string, content: string, mime: string) {
  const a = document.createElement('a')
  a.href = URL.createObjectURL(new Blob([content], { type: mime }))
  a.download = filename
  a.click()
  URL.revokeObjectURL(a.href)
}

export function main() {
  const draft = $('draft') as HTMLTextAreaElement
  const slider = $('threshold') as HTMLInputElement

  draft.addEventListener('input', () => {
    doc = editText(doc, draft.value)
    renderSections()
    renderResults()
  })
  slider.addEventListener('input', () => {
    // pure client-side recompute over cached probabilities
    doc = applyThreshold(doc, Number(slider.value))
    $('threshold-value').textContent = Number(slider.value).toFixed(2)
    renderResults()
  })
  $('check').addEventListener('click', () => void check())
  $('export-json').addEventListener('click', () =>
    download('citeworth-report.json', toJson(doc), 'application/json'))
  $('export-csv').addEventListener('click', () =>
    download('citeworth-report.csv', toCsv(doc), 'text/csv'))

  void fetchHealth(SERVICE_URL).then(({ ok, version }) => {
    $('health').textContent = ok ? `model v${version} ready` : 'service unavailable'
  })
  renderSections()
}

if (typeof document !== 'undefined' && document.readyState !== 'loading') {
  main()
} else if (typeof document !== 'undefined') {
  document.addEventListener('DOMContentLoaded', main)
}
