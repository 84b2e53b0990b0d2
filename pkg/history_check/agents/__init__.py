from history_check.agents.bob import BobStrategy, STRATEGY_CLASSES, make_strategy, bob_prepare
from history_check.agents.alice import ProtocolTranscript, alice_verify
from history_check.agents.protocol import RepetitionPlan, plan_repetitions, run_protocol
