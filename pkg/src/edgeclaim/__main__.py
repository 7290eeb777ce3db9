"""Allow `python -m edgeclaim`."""

from .cli import main

raise SystemExit(main())
