#!/usr/bin/env python3

"""Version of ridley, as written to logs and campaign records."""


class Version:
    def __init__(self, major, minor, patch, dev=False):
        self.major = major
        self.minor = minor
        self.patch = patch
        self.dev = dev

    def __repr__(self):
        suffix = "-devel" if self.dev else ""
        return f"{self.major}.{self.minor}.{self.patch}{suffix}"


__version__ = Version(0, 3, 0, dev=True)

if __name__ == "__main__":
    print(f"ridley v.{__version__}")
