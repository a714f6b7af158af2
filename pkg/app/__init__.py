# Python version check: 3.10-3.13
import sys

if sys.version_info < (3, 10) or sys.version_info >= (3, 14):
    print(
        "Warning: Unsupported Python version {ver}, please use 3.10-3.13".format(
            ver=".".join(map(str, sys.version_info))
        )
    )

__version__ = "0.4.0"
