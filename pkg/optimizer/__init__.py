from optimizer.minimize import BoxBounds, OptimizerConfig, finite_diff_gradient, minimize

__all__ = ["BoxBounds", "OptimizerConfig", "finite_diff_gradient", "minimize"]
