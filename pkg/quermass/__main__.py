import sys

from quermass.harness.cli import main


sys.exit(main())
