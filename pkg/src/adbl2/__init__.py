"""Assisted debate builder: bipolar argumentation trees, Kialo import/export,
two-label relation classification, verification and assist workflows, and the
dataset/evaluation pipeline."""

from .backends import (
    BackendRegistry,
    ConstantBackend,
    HttpBackend,
    OpenAICompletionBackend,
    ScoringBackend,
    SelfConsistencyBackend,
    StubBackend,
    StubRule,
)
from .classify import (
    BackendConfig,
    LabelScores,
    RelationClassification,
    classify,
    make_config,
    normalize,
    score_labels,
    technique_from_name,
)
from .dataset import (
    SplitSpec,
    Triple,
    TripleDataset,
    dataset_stats,
    emit_finetune_corpus,
    extract_triples,
    read_triples,
    split,
    undersample,
    write_triples,
)
from .evalreport import (
    ConfusionCounts,
    DomainRow,
    EvalReport,
    accumulate,
    evaluate,
    f1,
    macro_f1,
    render_report,
)
from .kialo import (
    KialoDocument,
    ParseDiagnostic,
    Severity,
    detect_domain,
    parse_kialo,
    read_title,
    serialize_kialo,
)
from .model import Argument, DebateTree, RelationEdge, RelationType, new_tree
from .prompts import (
    DEFAULT_TEMPLATE,
    FewShot,
    FewShotExample,
    PromptTemplate,
    ZeroShot,
    build_prompt,
    default_few_shot,
    prompt_fingerprint,
)
from .verification import (
    AssistFeedback,
    AssistVerdict,
    EdgeVerificationFailure,
    TreeVerificationSummary,
    VerificationResult,
    VerificationStatus,
    assist_new_argument,
    verify_edge,
    verify_tree,
    verify_worklist,
)

__version__ = "0.1.0"
