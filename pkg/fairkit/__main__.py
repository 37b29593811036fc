import sys

from fairkit.main import main

sys.exit(main())
