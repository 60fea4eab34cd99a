import sys

from rfgrowth.cli import main

sys.exit(main())
