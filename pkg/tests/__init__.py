# Test package for qkd_gain
