# Package initialization
