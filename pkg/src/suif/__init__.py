"""suif — a semantic-state mediated UI generation engine.

The semantic state (product / design system / feature / components) is the
single source of intent per session. Briefs parse into it, prompts compile
from it, generated artifacts are analyzed back into it, and refinement runs on
explicit path-level diffs.
"""

from .analysis import extract_semantics, newly_inferred
from .diffing import (
    ComponentOp,
    ComponentOpKind,
    DiffEntry,
    DiffKind,
    SemanticDiff,
    apply_diff,
    compute_diff,
    invert_diff,
    render_changelog,
)
from .engine import ServiceConfig, StudioEngine
from .errors import SuifError
from .gateway import (
    Attachment,
    GenerationRequest,
    ProviderGateway,
    ProviderMode,
    StructuredRequest,
    Task,
    canonical_request_hash,
)
from .generation import (
    DEFAULT_CONSTRAINTS,
    GeneratedArtifact,
    PromptDoc,
    compile_prompt,
    generate_initial,
    regenerate_scoped,
)
from .model import (
    AttributePath,
    AttributeValue,
    AugmentedSemantics,
    ComponentFragment,
    ComponentSpec,
    Level,
    Provenance,
    SemanticState,
    ShadowProposal,
    add_component,
    canonical_serialize,
    clear_attribute,
    deserialize,
    get_attribute,
    list_empty_attributes,
    merge_augmented,
    new_state,
    set_attribute,
    states_slot_equal,
)
from .parsing import ParsedSemantics, apply_parsed, parse_prompt
from .relations import (
    EdgeKind,
    RelationEdge,
    RelationGraph,
    accept_suggestion,
    affected_by,
    affects,
    analyze_relations,
    list_by_kind,
    validate_graph,
)
from .store import Session, SessionStore, VersionRecord

__all__ = [name for name in dir() if not name.startswith("_")]
