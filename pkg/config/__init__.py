"""Python package initialization file for config"""