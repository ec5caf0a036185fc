import sys

from isacopt.experiments.cli import main

sys.exit(main())
