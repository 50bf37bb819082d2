
import sys

from ts_jeffreys.app import main

sys.exit(main())
