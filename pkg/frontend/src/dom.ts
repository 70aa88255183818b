/** HTML renderers. Pure string builders so they run in node tests and in
 * the browser alike; main.ts wires them to live elements. */

import type { BarGroup } from "./bars.js";
import type { CardBoard } from "./cards.js";
import type { SimosResponse } from "./types.js";
import {
  formatCategory,
  formatLambdaInterval,
  formatOptional,
  tooltipPrecision,
  wholePercent,
} from "./format.js";

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderBarGroups(groups: BarGroup[]): string {
  const blocks = groups.map((group) => {
    const badges = [
      group.knockedOut ? '<span class="badge knockout">vetoed → C1</span>' : "",
      group.fragile && !group.knockedOut ? '<span class="badge fragile">fragile</span>' : "",
    ].join("");
    const bars = group.bars
      .map(
        (bar) => `
      <div class="bar" data-category="${escapeHtml(bar.category)}">
        <div class="fill" style="height:${bar.fraction * 100}%"
             title="${tooltipPrecision(bar.fraction)}"></div>
        <div class="whisker" style="height:${bar.se * 100}%"></div>
        <span class="value">${wholePercent(bar.fraction)}</span>
        <span class="label">${escapeHtml(bar.category)}</span>
      </div>`,
      )
      .join("");
    const table = group.fragile
      ? `<div class="breakpoints">${group.intervals
          .map((iv) => `<code>${formatLambdaInterval(iv)}</code>`)
          .join(" ")}</div>`
      : "";
    const errors = `type I ${formatOptional(group.typeI)} · type II ${formatOptional(group.typeII)}`;
    return `
  <section class="bar-group" data-alternative="${escapeHtml(group.alternative)}"
           data-modal="${group.modal}">
    <h3>${escapeHtml(group.alternative)} <em>${formatCategory(group.modal)}</em>${badges}</h3>
    <div class="bars">${bars}</div>
    <p class="errors">${errors}</p>
    ${table}
  </section>`;
  });
  return `<div class="run-panel">${blocks.join("")}</div>`;
}

export function renderWeightsTable(response: SimosResponse): string {
  const rows = Object.entries(response.weights)
    .map(
      ([criterion, weight]) => `
    <tr data-criterion="${escapeHtml(criterion)}">
      <td>${escapeHtml(criterion)}</td>
      <td class="weight" title="${tooltipPrecision(weight)}">${tooltipPrecision(weight)}</td>
    </tr>`,
    )
    .join("");
  return `
  <table class="weights">
    <thead><tr><th>criterion</th><th>normalized weight</th></tr></thead>
    <tbody>${rows}</tbody>
    <tfoot><tr><td>sum of non-normalized weights</td>
      <td title="${tooltipPrecision(response.total)}">${tooltipPrecision(response.total)}</td></tr></tfoot>
  </table>
  <p class="preorder"><code>${escapeHtml(response.preorder)}</code></p>`;
}

export function renderBoard(board: CardBoard, blockers: string[]): string {
  const unplaced = board.unplaced
    .map((c) => `<li class="card" draggable="true" data-criterion="${escapeHtml(c)}">${escapeHtml(c)}</li>`)
    .join("");
  const ranks = board.ranks
    .map((rank, index) => {
      const cards = rank
        .map((c) => `<li class="card" draggable="true" data-criterion="${escapeHtml(c)}">${escapeHtml(c)}</li>`)
        .join("");
      const gap =
        index < board.whiteCards.length
          ? `<div class="gap" data-gap="${index}">
               white cards: <input type="number" min="0" value="${board.whiteCards[index]}"></div>`
          : "";
      return `<div class="rank" data-rank="${index}"><ol>${cards}</ol></div>${gap}`;
    })
    .join("");
  const blockList = blockers.length
    ? `<ul class="blockers">${blockers.map((b) => `<li>${escapeHtml(b)}</li>`).join("")}</ul>`
    : "";
  return `
  <div class="card-board">
    <div class="tray"><h4>unplaced</h4><ul>${unplaced}</ul></div>
    <div class="ranks">${ranks}</div>
    <label>z <input type="number" class="z" step="0.1" min="1" value="${board.z}"></label>
    <button class="submit" ${blockers.length ? "disabled" : ""}>elicit weights</button>
    ${blockList}
  </div>`;
}

export function renderValidationReport(violations: { location: string; message: string }[]): string {
  const items = violations
    .map((v) => `<li><code>${escapeHtml(v.location)}</code>: ${escapeHtml(v.message)}</li>`)
    .join("");
  return `<ul class="violations">${items}</ul>`;
}
