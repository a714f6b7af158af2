"""Regenerate the checked-in fixtures under data/gallery."""

import sys
import os

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

from app.cli.gallery import write_gallery
from app.config import PROJECT_ROOT

if __name__ == "__main__":
    target = PROJECT_ROOT / "data" / "gallery"
    target.mkdir(parents=True, exist_ok=True)
    for path in write_gallery(target):
        print(path.relative_to(PROJECT_ROOT))
