# test suite for the code constructions and services
