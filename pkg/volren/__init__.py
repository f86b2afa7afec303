from volren.version import VERSION as __version__  # noqa
