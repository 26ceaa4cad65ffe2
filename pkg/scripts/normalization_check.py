"""Compare two ways of forcing runs to start on the left marker and end on
the right one: weight-one marker loops on every state, and anchoring with
fresh start and stop states.  Counts the words whose multiset changes."""

import argparse
import random

from wfokit.corpus import example_automaton, mirror_nest, random_automaton, random_finite_automaton, swept_example, words
from wfokit.runs import add_marker_loops, nwa_eval
from wfokit.translate import anchor


def changed(a, b, max_len: int) -> int:
    return sum(nwa_eval(a, u) != nwa_eval(b, u) for u in words(a.base, max_len))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--count", type=int, default=100)
    parser.add_argument("--max-len", type=int, default=4)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print("fixture          marker-loops  anchoring")
    for name, a in (("example", example_automaton()), ("mirror nest", mirror_nest()), ("swept example", swept_example())):
        print(f"{name:16s} {changed(a, add_marker_loops(a), args.max_len):12d} {changed(a, anchor(a), args.max_len):10d}")

    rng = random.Random(args.seed)
    for label, draw in (("any", random_automaton), ("finitely ambiguous", random_finite_automaton)):
        loops = anchored = 0
        for _ in range(args.count):
            a = draw(rng, states=3)
            loops += changed(a, add_marker_loops(a), args.max_len) > 0
            anchored += changed(a, anchor(a), args.max_len) > 0
        print(f"{args.count} random ({label}): marker loops change {loops}, anchoring changes {anchored}")


if __name__ == "__main__":
    main()
