"""
Parity Complement - дополнение недетерминированных автоматов четности
с переходной приемкой до автоматов Бюхи
"""

__version__ = "1.0.0"
__author__ = "Parity Complement Team"
