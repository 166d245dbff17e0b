"""Skellam processes of order k: samplers, analytic laws and verification"""
