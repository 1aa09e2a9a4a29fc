"""grash test suite."""
