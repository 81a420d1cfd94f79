// Wire types of the prediction service (field names are the contract).

export interface PredictRequest {
  raw_text?: string
  sentences?: { text: string; section_type?: string }[]
  contextual?: boolean
  threshold?: number
  flag_policy?: 'zeros' | 'two_pass'
}

export interface ScoredSentence {
  text: string
  probability: number
  worthy: boolean
  section_type: string
}

export interface PredictResponse {
  sentences: ScoredSentence[]
  model_info: {
    family: string
    attention_variant: string | null
    contextual: boolean
    representation: string | null
    version: number
    vocab_hash: string
  }
}

export type SectionType = 'introduction' | 'methods' | 'results' | 'discussion' | 'other'

export const SECTION_TYPES: SectionType[] = [
  'introduction',
  'methods',
  'results',
  'discussion',
  'other',
]
