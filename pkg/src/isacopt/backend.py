import isacopt.backends.mpi

backend = isacopt.backends.mpi
