import sys

from tropell.cli import main

sys.exit(main())
