from monochrom.cli import main

raise SystemExit(main())
