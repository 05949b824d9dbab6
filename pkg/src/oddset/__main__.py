import sys

from oddset.cli import main

sys.exit(main())
