"""Random experiments for the sweeping construction.

Draws finitely ambiguous two-way automata, makes them sweeping and compares
the semantics on every word up to ``--max-len``.  One line per automaton,
then a summary.
"""

import argparse
import random
import time

from wfokit.corpus import random_finite_automaton, words
from wfokit.monoid import is_aperiodic
from wfokit.nwa import is_sweeping
from wfokit.runs import Evaluator, nwa_eval
from wfokit.translate import sw_transform


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--count", type=int, default=20)
    parser.add_argument("--states", type=int, default=3)
    parser.add_argument("--max-len", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--annotated", action="store_true")
    parser.add_argument("--quiet", action="store_true")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    bad = not_sweeping = lost_aperiodicity = 0
    started = time.perf_counter()
    for i in range(args.count):
        a = random_finite_automaton(rng, states=args.states, horizon=4)
        t0 = time.perf_counter()
        result = sw_transform(a, annotated=args.annotated)
        nest = result.nwa
        ev = Evaluator()
        mismatches = sum(nwa_eval(nest, u, ev) != nwa_eval(a, u, ev) for u in words(a.base, args.max_len))
        sweeping = is_sweeping(nest) is not None
        aperiodic_kept = not is_aperiodic(a).aperiodic or is_aperiodic(nest).aperiodic
        bad += mismatches > 0
        not_sweeping += not sweeping
        lost_aperiodicity += not aperiodic_kept
        if not args.quiet:
            depth = max(x.depth for x in nest.descendants())
            print(
                f"{i:3d} automata {len(nest.descendants()):3d} depth {depth} "
                f"mismatches {mismatches} sweeping {sweeping} aperiodicity kept {aperiodic_kept} "
                f"{time.perf_counter() - t0:.2f} s"
            )
    print(
        f"{args.count} automata with {args.states} states: {bad} with mismatches, "
        f"{not_sweeping} not sweeping, {lost_aperiodicity} lost aperiodicity, "
        f"{time.perf_counter() - started:.1f} s"
    )


if __name__ == "__main__":
    main()
