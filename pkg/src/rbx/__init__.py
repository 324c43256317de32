"""Exact computation in free, localized and presented Rota-Baxter algebras over Q."""

from .base import (
    Algebra,
    AlgebraElement,
    AlgebraMap,
    BaseOperator,
    BaseRB,
    BasisKey,
    Denominator,
    OpKind,
    RBAlgebra,
    apply_base_operator,
    mul,
    split,
    transfer,
    verify_rb_axiom,
)
from .errors import DomainError, GuardError, InternalError, OperatorUndefined, ParseError, RBXError
from .expressions import Leaf, P, PNode, Product, RBExpression, Scale, Sum, evaluate, lift
from .free_rb import (
    FreeRB,
    ShuffleElement,
    collapse_phi,
    embed,
    evaluate_words,
    free_extension,
    map_words,
    msh_product,
    reconstruct,
    shuffle_P,
)
from .localize import (
    LocalizedElement,
    LocalizedRB,
    Variant,
    b_product,
    extend_to_localization,
    invert_image,
    p_localized,
    structure_map,
)
from .parsing import parse_element, parse_expression
from .presented import (
    EqualityVerdict,
    Localization,
    LocalizationTensorInstance,
    NormalForm,
    PresentedRB,
    Status,
    TensorProduct,
    check_localization_tensor,
    cross_check_localization,
    equal_mod_ideal,
    normalize,
    reset_normalizers,
    tensor_base,
    tensor_injections,
    universal_map,
)

__all__ = [
    "Algebra",
    "AlgebraElement",
    "AlgebraMap",
    "BaseOperator",
    "BaseRB",
    "BasisKey",
    "Denominator",
    "OpKind",
    "RBAlgebra",
    "apply_base_operator",
    "mul",
    "split",
    "transfer",
    "verify_rb_axiom",
    "DomainError",
    "GuardError",
    "InternalError",
    "OperatorUndefined",
    "ParseError",
    "RBXError",
    "Leaf",
    "P",
    "PNode",
    "Product",
    "RBExpression",
    "Scale",
    "Sum",
    "evaluate",
    "lift",
    "FreeRB",
    "ShuffleElement",
    "collapse_phi",
    "embed",
    "evaluate_words",
    "free_extension",
    "map_words",
    "msh_product",
    "reconstruct",
    "shuffle_P",
    "LocalizedElement",
    "LocalizedRB",
    "Variant",
    "b_product",
    "extend_to_localization",
    "invert_image",
    "p_localized",
    "structure_map",
    "parse_element",
    "parse_expression",
    "EqualityVerdict",
    "Localization",
    "LocalizationTensorInstance",
    "NormalForm",
    "PresentedRB",
    "Status",
    "TensorProduct",
    "check_localization_tensor",
    "cross_check_localization",
    "equal_mod_ideal",
    "normalize",
    "reset_normalizers",
    "tensor_base",
    "tensor_injections",
    "universal_map",
]
