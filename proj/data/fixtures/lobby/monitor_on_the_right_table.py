def execute_command(image):
    image_patch = ImagePatch(image)
    tables = image_patch.find('table')
    monitors = image_patch.find('monitor')
    if len(tables) == 0 or len(monitors) == 0:
        return {'function': 'None', 'error': 'Missing table or monitor.'}
    tables.sort(key=lambda t: t.horizontal_center)
    right_table = tables[-1]
    monitors.sort(key=lambda m: distance(m, right_table))
    monitor = monitors[0]
    return {'function': 'navigate_to_object', 'inputs': (monitor.horizontal_center, monitor.vertical_center), 'box': [monitor.left, monitor.lower, monitor.right, monitor.upper]}
