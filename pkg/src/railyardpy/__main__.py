import sys

from railyardpy.cli import main

sys.exit(main())
