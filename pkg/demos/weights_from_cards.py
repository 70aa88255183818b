"""Resolve a ranked card deck into criterion weights, step by step.

The first officer ranked twelve criteria from least to most important in
seven groups, put five blank cards before the technique criterion, and
judged the most important criterion eight times as important as the least.

Run: python demos/weights_from_cards.py
"""

from risksort import display_value, preorder_check, simos_resolve
from risksort.casestudy import load_dm1_deck


def main():
    deck = load_dm1_deck()
    print("preference chain (least to most important):")
    print(" ", preorder_check(deck).chain(), "\n")

    gaps = [w + 1 for w in deck.white_cards]
    print(f"unit gaps between ranks (white cards + 1): {gaps}, total e = {sum(gaps)}")
    print(f"importance ratio z = {deck.z}, unit u = (z - 1)/e = {(deck.z - 1) / sum(gaps):.4f}\n")

    result = simos_resolve(deck)
    print(f"{'rank':>4} {'criteria':<46} {'k(r)':>8} {'shown':>6}")
    for r, rank in enumerate(deck.ranks):
        k = result.rank_weights[r]
        print(f"{r + 1:>4} {', '.join(rank):<46} {k:>8.4f} {display_value(k):>6.2f}")
    print(f"\nsum of non-normalized weights: {result.total:.4f} "
          f"(worksheets truncate to {display_value(result.total):.2f})")

    print("\nnormalized weights (full precision):")
    for cid in deck.criterion_ids:
        print(f"  {cid:<26} {result.weights[cid]:.6f}")
    print("\nendpoints check: k(last)/k(first) =",
          result.rank_weights[-1] / result.rank_weights[0])


if __name__ == "__main__":
    main()
