"""NEAT genomes, mutation, crossover and speciation."""

from .genome import (
    HIDDEN,
    INPUT,
    OUTPUT,
    ConnectionGene,
    Genome,
    InnovationRegistry,
    InvalidGenome,
    NodeGene,
    create_initial_genome,
    validate,
)
from .mutation import (
    MutationConfig,
    add_connection,
    add_node,
    delete_connection,
    delete_node,
    mutate,
    perturb_biases,
    perturb_weights,
)
from .species import (
    EmptyPopulation,
    ReproductionConfig,
    SpeciationConfig,
    Species,
    allocate_offspring,
    compatibility_distance,
    crossover,
    reproduce,
    speciate,
)
