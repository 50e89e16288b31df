"""Convert every hand-built net and show what happens.

Block-structured nets come back as models. The three problem nets show the
two ways a conversion can stop, and how the reduction rules rescue the
third one.

    python demos/fixtures_tour.py
"""

from wf2powl import fixtures
from wf2powl.translate import ConvertOptions, convert_verified


def show(name, outcome):
    if outcome.ok:
        print(f"{name:26} model  {outcome.model!r}")
    else:
        print(f"{name:26} {outcome.status:6} {outcome.reason}")


def main():
    for name, make in fixtures.ALL.items():
        show(name, convert_verified(make()))

    print("\nsame nets with the reduction rules switched off:")
    plain = ConvertOptions(apply_reductions=False)
    for name in ("self_loop", "loop_redo_exit", "choice_with_concurrency"):
        show(name, convert_verified(fixtures.ALL[name](), plain))


if __name__ == "__main__":
    main()
