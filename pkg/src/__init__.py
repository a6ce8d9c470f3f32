"""
QEMLAB - Laboratorio de criptoanálisis cuántico
Cifrado Even-Mansour, juegos de reprogramación y ataques a escala de escritorio
"""
__version__ = "1.0.0"
