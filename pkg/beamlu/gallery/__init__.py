from beamlu.gallery.families import MatrixFamily, MatrixSpec, generate, is_random_family, random_blocking

__all__ = ["MatrixFamily", "MatrixSpec", "generate", "is_random_family", "random_blocking"]
