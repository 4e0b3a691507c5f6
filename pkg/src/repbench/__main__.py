import sys

from repbench.cli import main

sys.exit(main())
