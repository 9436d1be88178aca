__all__ = ['__version__', '__versiondate__', '__license__']

__version__      = '0.3.0'
__versiondate__  = '2026-10-17'
__license__      = 'rwdiff %s (%s) -- MIT license' % (__version__, __versiondate__)
