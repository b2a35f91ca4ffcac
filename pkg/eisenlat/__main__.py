import sys

from eisenlat.cli.main import main

sys.exit(main())
