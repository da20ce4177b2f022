#!/usr/bin/env python3
"""Enable ``python -m confshift`` as an alias for the ``confshift`` console script.

USAGE:
======
    python -m confshift simulate --spec config/dilemma.toml --out-dir out/
    python -m confshift select --pvalues pv.csv --procedure bh --out decision.json
"""

from confshift.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
