import sys

from hriapproach.cli import main

sys.exit(main())
