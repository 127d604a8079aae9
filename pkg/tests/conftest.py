"""Present so pytest adds this directory to sys.path (for _oracles)."""
