// Static face per expression label. No animation: the avatar is a single
// glyph that always shows the expression of the most recent reply.

import type { Expression } from "./types";

export const FACES: Record<Expression, string> = {
  neutral: "😐",
  joy: "😄",
  sadness: "😢",
  anger: "😠",
  fear: "😨",
  disgust: "🤢",
  surprise: "😮",
  doubt: "🤨",
  worry: "😟",
  sleeping: "😴",
};

const NEUTRAL_FACE = FACES.neutral;

export function faceFor(expression: string): string {
  return FACES[expression as Expression] ?? NEUTRAL_FACE;
}
