from .term import *
from .parsing import *
from .rewriting import *
from .replacement_map import *
from .oracle import *
from .utils import *
