import sys

from tbsg.cli import main

sys.exit(main())
