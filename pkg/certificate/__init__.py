from .certificate import *
from .check import *
from .render import *
