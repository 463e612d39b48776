import sys

from morse_thermo.cli import main

sys.exit(main())
