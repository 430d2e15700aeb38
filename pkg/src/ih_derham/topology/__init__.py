# ih_derham.topology
