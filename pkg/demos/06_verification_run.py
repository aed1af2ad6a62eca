"""
The full verification scenario
==============================

``verify_paper`` runs every check in a fixed order and collects records of
(expected, observed) verdicts.  The command line equivalent is::

    twistmod verify-paper --p 2 --q 2,4 --family v4-string --stages 3 --seed 7 --json report.json
"""

from twistmod.harness import verify_paper

rep = verify_paper(p=2, qs=[2, 4], family="v4-string", stages=2, seed=7)
by_anchor = {}
for r in rep.records:
    ok, total = by_anchor.get(r.anchor, (0, 0))
    by_anchor[r.anchor] = (ok + r.ok, total + 1)
for anchor, (ok, total) in sorted(by_anchor.items()):
    print(f"{anchor:<30} {ok}/{total}")
print("passed:", rep.passed, " seconds per section:", {k: round(v, 2) for k, v in rep.timing.items()})
