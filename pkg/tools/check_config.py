import sys
import os

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

from app.config import config

print("START_CONFIG_CHECK")
try:
    tolerances = config.tolerances
    print(f"WORKERS:{config.run.workers}")
    print(f"SEED:{config.run.seed}")
    print(f"TRUNCATION:{config.series.default_truncation}")
    for name, value in sorted(tolerances.model_dump().items()):
        print(f"TOL:{name}={value!r}")
except Exception as e:
    print(f"ERROR:{e}")
print("END_CONFIG_CHECK")
