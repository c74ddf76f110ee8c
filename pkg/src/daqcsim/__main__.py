import sys

from daqcsim.cli import main

sys.exit(main())
