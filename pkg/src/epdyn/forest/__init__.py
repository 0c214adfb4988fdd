from epdyn.forest.model import ForestConfig, ForestModel, fit_forest, train_forest

__all__ = ["ForestConfig", "ForestModel", "fit_forest", "train_forest"]
