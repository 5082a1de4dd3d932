from .coproduct import (
    CombineError,
    CoproductSystem,
    build_coproduct,
    coproduct_embedding,
    embed_theories,
    generation_check,
    verify_deltapsi,
)
from .amalgam import (
    AmalgamatedSystem,
    MaterializationError,
    algebraic_amalgam_embedding,
    build_amalgam,
    find_witness,
    renaming_quantale,
    representation_check,
    theory_module,
    verify_epsilon_embeddings,
    verify_zetadelta,
)
from .tensembed import tensembed_saturation_check
