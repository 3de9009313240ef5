from controller.mpc import MpcConfig, PlanResult, MimicController, horizon_cost, plan

__all__ = ["MpcConfig", "PlanResult", "MimicController", "horizon_cost", "plan"]
