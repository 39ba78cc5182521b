"""Test package for conformable-bvp."""
