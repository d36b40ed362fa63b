import sys

from iwtwm.cli import main

sys.exit(main())
