/** Card-board model: rank criteria from least to most important, insert
 * white separator cards, pick the importance ratio z. Pure state +
 * transitions; the DOM layer only forwards user gestures here. Weight
 * numbers are never computed on the board - submission goes to the
 * service. */

import type { DeckPayload } from "./types.js";

export interface CardBoard {
  /** Criteria not yet placed on the board. */
  unplaced: string[];
  /** Ranks, least important first; each holds criterion ids. */
  ranks: string[][];
  /** White cards between rank r and r+1 (length = ranks.length - 1). */
  whiteCards: number[];
  z: number;
}

export function emptyBoard(criteria: string[], z = 2): CardBoard {
  return { unplaced: [...criteria], ranks: [], whiteCards: [], z };
}

function withoutCard(board: CardBoard, criterion: string): CardBoard {
  const ranks = board.ranks.map((rank) => rank.filter((c) => c !== criterion));
  const unplaced = board.unplaced.filter((c) => c !== criterion);
  // drop ranks emptied by the removal, and their trailing separator
  const kept: string[][] = [];
  const white: number[] = [];
  ranks.forEach((rank, index) => {
    if (rank.length > 0) {
      kept.push(rank);
      if (kept.length > 1) white.push(board.whiteCards[index - 1] ?? 0);
    }
  });
  return { unplaced, ranks: kept, whiteCards: white, z: board.z };
}

/** Drop a card onto an existing rank (0-based). */
export function placeInRank(board: CardBoard, criterion: string, rankIndex: number): CardBoard {
  const cleared = withoutCard(board, criterion);
  if (rankIndex < 0 || rankIndex >= cleared.ranks.length) {
    throw new RangeError(`no rank ${rankIndex}`);
  }
  const ranks = cleared.ranks.map((rank, i) =>
    i === rankIndex ? [...rank, criterion] : rank,
  );
  return { ...cleared, ranks };
}

/** Drop a card as a new rank at the given position (defaults to the end). */
export function placeAsNewRank(board: CardBoard, criterion: string, position?: number): CardBoard {
  const cleared = withoutCard(board, criterion);
  const at = position === undefined ? cleared.ranks.length : position;
  if (at < 0 || at > cleared.ranks.length) throw new RangeError(`no position ${at}`);
  const ranks = [...cleared.ranks.slice(0, at), [criterion], ...cleared.ranks.slice(at)];
  const whiteCards = [...cleared.whiteCards];
  if (ranks.length > 1) whiteCards.splice(Math.min(at, whiteCards.length), 0, 0);
  return { ...cleared, ranks, whiteCards };
}

/** Pull a card back off the board. */
export function unplace(board: CardBoard, criterion: string): CardBoard {
  const cleared = withoutCard(board, criterion);
  return { ...cleared, unplaced: [...cleared.unplaced, criterion] };
}

export function setWhiteCards(board: CardBoard, gapIndex: number, count: number): CardBoard {
  if (gapIndex < 0 || gapIndex >= board.whiteCards.length) {
    throw new RangeError(`no gap ${gapIndex}`);
  }
  if (!Number.isInteger(count) || count < 0) {
    throw new RangeError(`white cards must be a nonnegative integer, got ${count}`);
  }
  const whiteCards = board.whiteCards.map((w, i) => (i === gapIndex ? count : w));
  return { ...board, whiteCards };
}

export function setZ(board: CardBoard, z: number): CardBoard {
  return { ...board, z };
}

/** Problems that block submission, rendered inline by the board view. */
export function submissionBlockers(board: CardBoard): string[] {
  const blockers: string[] = [];
  if (board.unplaced.length > 0) {
    blockers.push(`unplaced criteria: ${board.unplaced.join(", ")}`);
  }
  if (board.ranks.length === 0) blockers.push("no ranks on the board");
  if (!(board.z > 1)) blockers.push("importance ratio z must exceed 1");
  return blockers;
}

/** Serialize for POST /weights/simos; throws if submission is blocked. */
export function toDeckPayload(board: CardBoard): DeckPayload {
  const blockers = submissionBlockers(board);
  if (blockers.length > 0) {
    throw new Error(`deck not submittable: ${blockers.join("; ")}`);
  }
  return {
    ranks: board.ranks.map((rank) => [...rank]),
    white_cards: [...board.whiteCards],
    z: board.z,
  };
}

/** Rebuild a board from a saved deck (draft restore). */
export function boardFromDeck(deck: DeckPayload, allCriteria: string[]): CardBoard {
  const placed = new Set(deck.ranks.flat());
  return {
    unplaced: allCriteria.filter((c) => !placed.has(c)),
    ranks: deck.ranks.map((rank) => [...rank]),
    whiteCards: [...deck.white_cards],
    z: deck.z,
  };
}
