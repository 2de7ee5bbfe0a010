"""Train PPMI-SVD embeddings and induce VAD emotion lexicons from seed words."""
__version__ = "0.1.0"
