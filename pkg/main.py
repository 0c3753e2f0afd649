#!/usr/bin/env python3
"""Model-free control simulator - main entry point.

Equivalent to the installed ``mfcsim`` command:

  python main.py run --scenario linear-2x2
  python main.py compare --scenario three-tank --out results/three-tank/
"""

import sys

from mfcsim.cli import main

if __name__ == "__main__":
    sys.exit(main())
