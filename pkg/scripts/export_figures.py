#!/usr/bin/env python3
"""Export DOT renderings of the worked-example nets (forward and
reversible) into an output directory.

    python scripts/export_figures.py [outdir]
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from rccsnet.ccs import parse_process
from rccsnet.dot import to_dot
from rccsnet.encode import encode
from rccsnet.petri import explore
from rccsnet.unravel import reverse

TERMS = {
    "prefix_chain": "a.b.0",
    "parallel": "a.b | ~a.c",
    "choice": "a.b + ~a.c",
    "restricted": "(a.b | ~a.c)\\a",
    "two_syncs": "a.a | (~a + b)",
}


def main() -> int:
    outdir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "figures")
    outdir.mkdir(parents=True, exist_ok=True)
    for name, term in TERMS.items():
        net = encode(parse_process(term))
        (outdir / f"{name}.dot").write_text(to_dot(explore(net), title=term))
        (outdir / f"{name}_reversible.dot").write_text(
            to_dot(explore(reverse(net)), title=term + " (reversible)")
        )
        print(f"wrote {name}.dot and {name}_reversible.dot")
    print(f"renderable with: dot -Tpng -O {outdir}/*.dot")
    return 0


if __name__ == "__main__":
    sys.exit(main())
