"""Run the fairkit command-line interface."""

import sys

from fairkit.main import main

if __name__ == "__main__":
    sys.exit(main())
