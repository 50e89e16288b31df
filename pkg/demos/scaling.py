"""Time the translator on generated nets of growing size.

Each net is built from a random model, so it is safe and sound by
construction and the soundness precheck is skipped.

    python demos/scaling.py [count]
"""

import math
import statistics
import sys
import time

from wf2powl.corpus import make_benchmark
from wf2powl.translate import ConvertOptions, convert


def main(count=200):
    opts = ConvertOptions(check_soundness=False)
    rows = []
    for item in make_benchmark(count, 20, 400, seed=1):
        start = time.perf_counter()
        ok = convert(item.net, opts).ok
        rows.append((len(item.net.transitions), time.perf_counter() - start, ok))

    sizes = [r[0] for r in rows]
    times = [r[1] for r in rows]
    fit = statistics.linear_regression([math.log(s) for s in sizes], [math.log(t) for t in times])
    print(f"nets        {len(rows)} ({sum(r[2] for r in rows)} converted)")
    print(f"transitions {min(sizes)}..{max(sizes)}")
    print(f"median      {statistics.median(times) * 1000:.1f} ms")
    print(f"max         {max(times) * 1000:.1f} ms")
    print(f"log-log     slope {fit.slope:.2f}")
    # coarse buckets give a feel for the growth
    for lo in (20, 50, 100, 200):
        bucket = [t for s, t, _ in rows if lo <= s < lo * 2]
        if bucket:
            print(f"  {lo:>3}-{lo * 2 - 1:<3} {statistics.mean(bucket) * 1000:7.1f} ms avg over {len(bucket)}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 200)
