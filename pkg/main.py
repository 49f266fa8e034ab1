from __future__ import annotations

from reflex.cli import main


if __name__ == "__main__":  # pragma: no cover - direct execution guard
    main()
