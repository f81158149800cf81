import logging
import sys

from app.main import main
from config import config


def configure_logging():
    handlers = [logging.StreamHandler()]
    if config.log_file:
        handlers.append(logging.FileHandler(config.log_file))
    logging.basicConfig(
        level=getattr(logging, config.LOG_LEVEL.upper(), logging.INFO),
        format=config.LOG_FORMAT,
        handlers=handlers,
    )


if __name__ == "__main__":
    configure_logging()
    sys.exit(main())
