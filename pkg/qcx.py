#!/usr/bin/env python3
"""qcx entry point."""

import sys

from dotenv import load_dotenv

load_dotenv()

from app.cli.runner import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
