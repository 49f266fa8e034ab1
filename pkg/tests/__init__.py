# Test package for reflex
