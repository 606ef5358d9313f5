"""ARIMA forecasting of monthly count series."""
