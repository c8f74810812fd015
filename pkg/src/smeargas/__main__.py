import sys

from smeargas.cli import main

sys.exit(main())
