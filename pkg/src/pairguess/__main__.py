from pairguess.cli import main
import sys

sys.exit(main())
