namespace hslab {}
