// engine: filled in later
