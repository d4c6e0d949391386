"""Figure rendering for kicked-top simulation CSV outputs."""

__version__ = "0.1.0"

from .figures import RENDERERS, render
from .recipes import FIGURE_IDS, SCHEMAS, FigureRecipe, RecipeError, load_recipe, read_table
