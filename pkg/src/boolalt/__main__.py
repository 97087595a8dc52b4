import sys

from boolalt.cli import main

sys.exit(main())
