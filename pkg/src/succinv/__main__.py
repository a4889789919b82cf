import sys

from succinv.cli import main

sys.exit(main())
