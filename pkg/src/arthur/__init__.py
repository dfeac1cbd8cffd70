"""Conversational agent engine with an autobiographical memory model.

Typical use::

    from arthur import AgentEngine, TurnInput

    engine = AgentEngine()
    session = engine.create_session()
    reply = engine.post_turn(session.id, TurnInput(text="hello"))
    print(reply.text, reply.expression)

The memory model lives in :mod:`arthur.memory_core`, the text pipeline in
:mod:`arthur.text_pipeline`, conversation control in
:mod:`arthur.dialogue_manager`, and the store format in
:mod:`arthur.persistence`. ``arthur`` (CLI) and ``arthur-serve`` (REST) are
installed as console scripts.
"""

from .dialogue_manager import AgentReply, DialogueManager, DialogueState, TurnInput
from .engine import AgentEngine
from .errors import (
    ArthurError,
    IntegrityError,
    PersistenceError,
    UnknownResourceError,
    UnknownSessionError,
    ValidationError,
)
from .memory_core import (
    ConsolidationReport,
    EmotionLabel,
    EventType,
    GeneralEvent,
    LongTermMemory,
    MemoryCore,
    Resource,
    ShortTermMemory,
)
from .persistence import AgentConfig, load_config, load_ltm, save_ltm

__version__ = "0.1.0"

__all__ = [
    "AgentConfig",
    "AgentEngine",
    "AgentReply",
    "ArthurError",
    "ConsolidationReport",
    "DialogueManager",
    "DialogueState",
    "EmotionLabel",
    "EventType",
    "GeneralEvent",
    "IntegrityError",
    "LongTermMemory",
    "MemoryCore",
    "PersistenceError",
    "Resource",
    "ShortTermMemory",
    "TurnInput",
    "UnknownResourceError",
    "UnknownSessionError",
    "ValidationError",
    "load_config",
    "load_ltm",
    "save_ltm",
    "__version__",
]
