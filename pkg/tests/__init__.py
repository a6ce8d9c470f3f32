"""Tests de QEMLAB"""
