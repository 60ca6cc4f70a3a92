import sys

from tmprover.cli import main

sys.exit(main())
