"""Sandpiles, rotor-routing and Eulerian tours on ribbon graphs."""
