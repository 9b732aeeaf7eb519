#!/usr/bin/env python3
"""Write the default per-section configuration files for schmidtbec."""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from schmidtbec.core.config import ConfigurationManager


def main() -> int:
    """Create any missing section file in the configuration directory."""
    config_dir = sys.argv[1] if len(sys.argv) > 1 else None
    manager = ConfigurationManager(config_dir)
    manager.create_default_configs()

    print(f"Configuration directory: {manager.config_dir}")
    for config_file in sorted(manager.config_dir.glob("*.json")):
        print(f"  - {config_file.name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
