# Core settings, logging, errors and seeding
